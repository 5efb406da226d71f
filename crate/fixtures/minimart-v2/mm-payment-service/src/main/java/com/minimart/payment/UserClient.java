package com.minimart.payment;

import org.springframework.stereotype.Service;
import org.springframework.web.client.RestTemplate;

@Service
public class UserClient {

    private static final String USER_URL = "http://mm-user-service/api/v1/users/";

    private final RestTemplate restTemplate = new RestTemplate();

    public String billingAccount(String uid) {
        return restTemplate.getForObject(USER_URL + uid, String.class);
    }
}
